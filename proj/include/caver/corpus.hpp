#pragma once

#include <string>
#include <vector>

#include "caver/causal/json_io.hpp"

namespace caver::corpus {

using causal::json;

/// g+b voters V1..Vn (G first), majority table WIN, context preset "actual".
json vote_model(int g_votes, int b_votes);

json rocks_naive_model();    // BS = ST | BT, presets both_throw / suzy_only / nobody
json rocks_preempt_model();  // SH = ST, BH = BT & !SH, BS = SH | BH

json squad_model();          // M1..M10, DEATH, presets live1..live10
json squad_epistemic();      // uniform 1/10 over squad.json's presets

json reqgrant_kripke();      // req, then three grants, then nothing forever
json gpq_kripke();           // one state labeled {p,q}, self loop

struct CorpusFile {
  std::string name;
  json content;
};

/// The bundled examples in a fixed order, file names included.
std::vector<CorpusFile> corpus_files();

/// Writes every corpus file into dir (created if missing). Returns the paths.
std::vector<std::string> write_corpus(const std::string& dir);

}  // namespace caver::corpus
