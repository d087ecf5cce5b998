#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace netcomm::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;         // bad flags, unreadable or malformed input
inline constexpr int kPrecondition = 3;  // algorithm precondition (e.g. disconnected graph)

// Runs one command line (without the program name). Everything the command
// prints goes to `out` / `err`; files are written atomically.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

// Thread cap from NETCOMM_THREADS, else the hardware concurrency (>= 1).
std::size_t thread_budget();

}  // namespace netcomm::cli
