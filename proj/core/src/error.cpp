#include "stablediff/error.hpp"

namespace stablediff {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::NotPositiveRecurrent: return "NotPositiveRecurrent";
    case ErrorCode::NotIntegrable: return "NotIntegrable";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ClassificationFailed: return "ClassificationFailed";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::NotCentered: return "NotCentered";
    case ErrorCode::PoissonUnavailable: return "PoissonUnavailable";
    case ErrorCode::Divergent: return "Divergent";
    case ErrorCode::PathExploded: return "PathExploded";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::WindowNotFound: return "WindowNotFound";
    case ErrorCode::TooManyClips: return "TooManyClips";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace stablediff
