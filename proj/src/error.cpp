#include "colplan/error.hpp"

namespace colplan {

std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NextOperatorForbidden: return "NextOperatorForbidden";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::NoPositiveWitness: return "NoPositiveWitness";
    case ErrorCode::InvalidWorld: return "InvalidWorld";
    case ErrorCode::InvalidTask: return "InvalidTask";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::EmptyLanguage: return "EmptyLanguage";
    case ErrorCode::UnsupportedMission: return "UnsupportedMission";
    case ErrorCode::NoAcceptingPath: return "NoAcceptingPath";
    case ErrorCode::LevelDisconnected: return "LevelDisconnected";
    case ErrorCode::DeadlockDetected: return "DeadlockDetected";
    case ErrorCode::NegativeObligationViolated: return "NegativeObligationViolated";
    case ErrorCode::ProtocolStuck: return "ProtocolStuck";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InfeasibleMission: return "InfeasibleMission";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace colplan
