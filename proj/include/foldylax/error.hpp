#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace foldylax {

enum class ErrorCode {
  EmptyCluster,
  OverlappingBodies,
  InvalidBody,
  InvalidMesh,
  DegenerateMesh,
  CoincidentPoints,
  CoincidentWithCenter,
  InvalidWave,
  SingularOperator,
  WrongSignTensor,
  SingularSystem,
  CapExceeded,
  NoConvergence,
  Divergence,
  ComplexWavenumberFarField,
  SizeParameterTooLarge,
  ConfigParse,
  FileIO,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Non-fatal diagnostics (precondition violations that only downgrade
// accuracy). The default handler prints to stderr.
using WarningHandler = std::function<void(const std::string&)>;

void warn(const std::string& message);
WarningHandler set_warning_handler(WarningHandler handler);

}  // namespace foldylax
