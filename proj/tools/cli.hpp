#pragma once

#include <ostream>

namespace iqgal::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kBadDiscriminant = 2;
inline constexpr int kDisagreement = 3;
inline constexpr int kFailure = 4;  // file or configuration errors at run time

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iqgal::cli
