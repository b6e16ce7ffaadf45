#include "ipgm/error.hpp"

namespace ipgm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroNormVector: return "ZeroNormVector";
    case ErrorCode::NonFiniteComponent: return "NonFiniteComponent";
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::Io: return "Io";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::AlreadyDeleted: return "AlreadyDeleted";
    case ErrorCode::AlreadyMasked: return "AlreadyMasked";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::AllMasked: return "AllMasked";
    case ErrorCode::DegeneratePosition: return "DegeneratePosition";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::MalformedLog: return "MalformedLog";
    case ErrorCode::DanglingDeleteReference: return "DanglingDeleteReference";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::TargetUnreachable: return "TargetUnreachable";
  }
  return "Unknown";
}

}  // namespace ipgm
