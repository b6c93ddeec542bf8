#include "caver/corpus.hpp"

#include <filesystem>

namespace caver::corpus {

json vote_model(int g_votes, int b_votes) {
  int n = g_votes + b_votes;
  json exo = json::object(), endo = json::object(), eqs = json::object();
  json dom = json::array({"G", "B"});
  for (int i = 1; i <= n; ++i) exo["U" + std::to_string(i)] = dom;
  for (int i = 1; i <= n; ++i) endo["V" + std::to_string(i)] = dom;
  endo["WIN"] = dom;
  for (int i = 1; i <= n; ++i) eqs["V" + std::to_string(i)] = "U" + std::to_string(i);

  json inputs = json::array();
  for (int i = 1; i <= n; ++i) inputs.push_back("V" + std::to_string(i));
  json rows = json::object();
  for (long long mask = 0; mask < (1LL << n); ++mask) {
    std::string key;
    int g = 0;
    for (int i = 0; i < n; ++i) {
      bool is_g = (mask >> i) & 1;
      if (i) key += ",";
      key += is_g ? "G" : "B";
      g += is_g ? 1 : 0;
    }
    rows[key] = 2 * g > n ? "G" : "B";
  }
  eqs["WIN"] = json{{"inputs", inputs}, {"rows", rows}};

  json ctx = json::object();
  for (int i = 1; i <= n; ++i) ctx["U" + std::to_string(i)] = i <= g_votes ? "G" : "B";

  return json{{"exogenous", exo},
              {"endogenous", endo},
              {"equations", eqs},
              {"contexts", {{"actual", ctx}}}};
}

json rocks_naive_model() {
  return json{{"exogenous", {{"UST", {"0", "1"}}, {"UBT", {"0", "1"}}}},
              {"endogenous", {{"ST", {"0", "1"}}, {"BT", {"0", "1"}}, {"BS", {"0", "1"}}}},
              {"equations", {{"ST", "UST"}, {"BT", "UBT"}, {"BS", "ST | BT"}}},
              {"contexts",
               {{"both_throw", {{"UST", "1"}, {"UBT", "1"}}},
                {"suzy_only", {{"UST", "1"}, {"UBT", "0"}}},
                {"nobody", {{"UST", "0"}, {"UBT", "0"}}}}}};
}

json rocks_preempt_model() {
  return json{{"exogenous", {{"UST", {"0", "1"}}, {"UBT", {"0", "1"}}}},
              {"endogenous",
               {{"ST", {"0", "1"}},
                {"BT", {"0", "1"}},
                {"SH", {"0", "1"}},
                {"BH", {"0", "1"}},
                {"BS", {"0", "1"}}}},
              {"equations",
               {{"ST", "UST"},
                {"BT", "UBT"},
                {"SH", "ST"},
                {"BH", "BT & !SH"},
                {"BS", "SH | BH"}}},
              {"contexts",
               {{"both_throw", {{"UST", "1"}, {"UBT", "1"}}},
                {"suzy_only", {{"UST", "1"}, {"UBT", "0"}}},
                {"billy_only", {{"UST", "0"}, {"UBT", "1"}}}}}};
}

json squad_model() {
  json exo = json::object(), endo = json::object(), eqs = json::object();
  json dom = json::array({"0", "1"});
  for (int i = 1; i <= 10; ++i) exo["U" + std::to_string(i)] = dom;
  for (int i = 1; i <= 10; ++i) exo["L" + std::to_string(i)] = dom;
  std::string death;
  for (int i = 1; i <= 10; ++i) {
    endo["M" + std::to_string(i)] = dom;
    eqs["M" + std::to_string(i)] = "U" + std::to_string(i);
    if (i > 1) death += " | ";
    death += "M" + std::to_string(i) + " & L" + std::to_string(i);
  }
  endo["DEATH"] = dom;
  eqs["DEATH"] = death;

  json ctxs = json::object();
  for (int live = 1; live <= 10; ++live) {
    json c = json::object();
    for (int i = 1; i <= 10; ++i) c["U" + std::to_string(i)] = "1";
    for (int i = 1; i <= 10; ++i) c["L" + std::to_string(i)] = i == live ? "1" : "0";
    ctxs["live" + std::to_string(live)] = std::move(c);
  }
  return json{
      {"exogenous", exo}, {"endogenous", endo}, {"equations", eqs}, {"contexts", ctxs}};
}

json squad_epistemic() {
  json sits = json::array();
  for (int live = 1; live <= 10; ++live)
    sits.push_back(json{{"model", "squad.json"},
                        {"context", "live" + std::to_string(live)},
                        {"probability", "1/10"}});
  return json{{"situations", sits}};
}

json reqgrant_kripke() {
  return json{{"atoms", {"req", "grant"}},
              {"states", {"s0", "s1", "s2", "s3", "s4"}},
              {"initial", {"s0"}},
              {"edges", json::array({json::array({"s0", "s1"}), json::array({"s1", "s2"}),
                                     json::array({"s2", "s3"}), json::array({"s3", "s4"}),
                                     json::array({"s4", "s4"})})},
              {"labels",
               {{"s0", {"req"}},
                {"s1", {"grant"}},
                {"s2", {"grant"}},
                {"s3", {"grant"}},
                {"s4", json::array()}}}};
}

json gpq_kripke() {
  return json{{"atoms", {"p", "q"}},
              {"states", {"s0"}},
              {"initial", {"s0"}},
              {"edges", json::array({json::array({"s0", "s0"})})},
              {"labels", {{"s0", {"p", "q"}}}}};
}

std::vector<CorpusFile> corpus_files() {
  return {
      {"vote11.json", vote_model(11, 0)},
      {"vote65.json", vote_model(6, 5)},
      {"rocks_naive.json", rocks_naive_model()},
      {"rocks_preempt.json", rocks_preempt_model()},
      {"squad.json", squad_model()},
      {"squad_epistemic.json", squad_epistemic()},
      {"reqgrant.json", reqgrant_kripke()},
      {"gpq.json", gpq_kripke()},
  };
}

std::vector<std::string> write_corpus(const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (const auto& f : corpus_files()) {
    std::string path = (std::filesystem::path(dir) / f.name).string();
    causal::write_json_file(f.content, path);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace caver::corpus
