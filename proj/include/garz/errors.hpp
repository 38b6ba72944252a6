#pragma once

#include <stdexcept>
#include <string>

namespace garz {

/// A structural assumption on the model data does not hold; the message
/// names the condition and a witness point.
struct AssumptionViolated : std::runtime_error {
  explicit AssumptionViolated(const std::string& what) : std::runtime_error(what) {}
};

struct SupportTooWide : std::runtime_error {
  explicit SupportTooWide(const std::string& what) : std::runtime_error(what) {}
};

struct NegativeU : std::runtime_error {
  explicit NegativeU(const std::string& what) : std::runtime_error(what) {}
};

struct KernelKindMismatch : std::runtime_error {
  explicit KernelKindMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct GridTooShort : std::runtime_error {
  explicit GridTooShort(const std::string& what) : std::runtime_error(what) {}
};

struct CflViolation : std::runtime_error {
  explicit CflViolation(const std::string& what) : std::runtime_error(what) {}
};

struct OrderingLost : std::runtime_error {
  explicit OrderingLost(const std::string& what) : std::runtime_error(what) {}
};

struct BlowupDetected : std::runtime_error {
  explicit BlowupDetected(const std::string& what) : std::runtime_error(what) {}
};

struct NonconcaveFlux : std::runtime_error {
  explicit NonconcaveFlux(const std::string& what) : std::runtime_error(what) {}
};

struct WindowOutOfGrid : std::runtime_error {
  explicit WindowOutOfGrid(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientData : std::runtime_error {
  explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

struct GridMismatch : std::runtime_error {
  explicit GridMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateRoots : std::logic_error {
  explicit DegenerateRoots(const std::string& what) : std::logic_error(what) {}
};

/// Scenario file syntax error; carries the 1-based line number.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

}  // namespace garz
