#include "air/error.hpp"

namespace air {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::behind_device: return "behind-device";
    case ErrorCode::degenerate_configuration: return "degenerate-configuration";
    case ErrorCode::underdetermined: return "underdetermined";
    case ErrorCode::convergence: return "convergence";
    case ErrorCode::decomposition: return "decomposition";
    case ErrorCode::limit: return "limit";
    case ErrorCode::empty_observation: return "empty-observation";
    case ErrorCode::eye_on_screen_plane: return "eye-on-screen-plane";
    case ErrorCode::empty_intersection: return "empty-intersection";
    case ErrorCode::stage: return "stage";
    case ErrorCode::schema: return "schema";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace air
