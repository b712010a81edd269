#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "odelin/pipeline.hpp"

namespace odelin {

inline constexpr const char* kVersion = "0.1.0";

struct Report {
  std::string command;
  std::string source;  // file path, "-" for standard input, or "example N"
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::string timestamp;
  const Analysis* analysis = nullptr;
  const Verification* verification = nullptr;
  std::optional<Method> reduction;  // trace singled out by `reduce`
  std::optional<FormId> checked_form;
  std::string verdict;
  int exit_code = 0;
};

/// Key order is fixed; re-running with the same seed changes only "timestamp".
nlohmann::ordered_json to_json(const Report& r);

struct Diagnostic {
  std::string kind;  // parse, normalize, usage, io, internal
  std::string message;
  std::optional<std::size_t> offset;
};

nlohmann::ordered_json diagnostic_json(const std::string& command, const std::string& source, const Diagnostic& d,
                                       std::uint64_t seed, const std::string& timestamp, int exit_code);

std::string utc_timestamp();

nlohmann::ordered_json to_json(const ZeroVerdict& v);
nlohmann::ordered_json to_json(const ConstraintReport& r);
nlohmann::ordered_json to_json(const ReductionTrace& t);
nlohmann::ordered_json to_json(const ResidualStats& s);

}  // namespace odelin
