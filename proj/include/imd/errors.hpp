#pragma once
#include <stdexcept>

namespace imd {

// Bad arguments or misuse of a documented contract (CLI exit code 2).
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Conditioning selected an empty side of the support (CLI exit code 3).
struct empty_condition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested analysis is inconsistent with the phase classification (CLI exit code 4).
struct classification_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An internal numerical contract failed (CLI exit code 5).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A scan window did not contain the feature searched for.
struct window_error : numerical_error {
  using numerical_error::numerical_error;
};

}  // namespace imd
