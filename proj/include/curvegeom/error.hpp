#pragma once

#include <stdexcept>
#include <string>

namespace curvegeom {

enum class ErrorCode {
  InvalidArgument,   // bad parameters (grid size, window, config)
  NonRegular,        // |r'(t)| below the regularity floor
  NotClosed,         // curve fails the closure check
  LengthMismatch,    // sample array does not match the grid
  InflexionPoint,    // Frenet data requested where curvature vanishes
  OverlapVanishes,   // frame overlap |Q*(0).Q(t)| below the certifiable floor
  NotConverged,      // grid-doubling cap reached before tolerance
  SelfIntersection,  // chord below the self-distance floor
  CurvesTouch,       // two-curve distance below floor
  EpsilonTooLarge,   // ribbon offset exceeds half the self-distance
  FrameNotClosed,    // ribbon construction needs a closing frame
  OutsideWindow,     // asymptotic formula queried outside its validity window
  InsufficientRows,  // sweep analysis needs more rows
  IoFailure,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonRegular: return "NonRegular";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InflexionPoint: return "InflexionPoint";
    case ErrorCode::OverlapVanishes: return "OverlapVanishes";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::SelfIntersection: return "SelfIntersection";
    case ErrorCode::CurvesTouch: return "CurvesTouch";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::FrameNotClosed: return "FrameNotClosed";
    case ErrorCode::OutsideWindow: return "OutsideWindow";
    case ErrorCode::InsufficientRows: return "InsufficientRows";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace curvegeom
