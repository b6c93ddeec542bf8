#pragma once

#include <stdexcept>
#include <string>

namespace caver {

enum class ErrorKind {
  CyclicModel,
  PartialFunction,
  UnknownVariable,
  ValueOutOfDomain,
  FormulaMentionsExogenous,
  SignatureMismatch,
  CapExceeded,
  SyntaxError,
  UnknownAtom,
  AlphabetMismatch,
  SpecificationFails,
  FormulaHolds,
  OutputAlreadyDetermined,
  InvalidModel,
  InvalidInput,
  IoError,
};

const char* to_string(ErrorKind k);

/// All library failures are reported as Error with a machine-checkable kind.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::CyclicModel: return "CyclicModel";
    case ErrorKind::PartialFunction: return "PartialFunction";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::ValueOutOfDomain: return "ValueOutOfDomain";
    case ErrorKind::FormulaMentionsExogenous: return "FormulaMentionsExogenous";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownAtom: return "UnknownAtom";
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::SpecificationFails: return "SpecificationFails";
    case ErrorKind::FormulaHolds: return "FormulaHolds";
    case ErrorKind::OutputAlreadyDetermined: return "OutputAlreadyDetermined";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

}  // namespace caver
