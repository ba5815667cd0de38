#include "foldylax/error.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace foldylax {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::OverlappingBodies: return "OverlappingBodies";
    case ErrorCode::InvalidBody: return "InvalidBody";
    case ErrorCode::InvalidMesh: return "InvalidMesh";
    case ErrorCode::DegenerateMesh: return "DegenerateMesh";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::CoincidentWithCenter: return "CoincidentWithCenter";
    case ErrorCode::InvalidWave: return "InvalidWave";
    case ErrorCode::SingularOperator: return "SingularOperator";
    case ErrorCode::WrongSignTensor: return "WrongSignTensor";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Divergence: return "Divergence";
    case ErrorCode::ComplexWavenumberFarField: return "ComplexWavenumberFarField";
    case ErrorCode::SizeParameterTooLarge: return "SizeParameterTooLarge";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::FileIO: return "FileIO";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler_slot() {
  static WarningHandler h = [](const std::string& msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return h;
}

}  // namespace

void warn(const std::string& message) {
  WarningHandler h;
  {
    std::lock_guard<std::mutex> lock(handler_mutex());
    h = handler_slot();
  }
  if (h) h(message);
}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(handler_mutex());
  return std::exchange(handler_slot(), std::move(handler));
}

}  // namespace foldylax
