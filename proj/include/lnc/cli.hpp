#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace lnc::cli {

/// Runs one command. `args` excludes the program name. Returns 0 on
/// success, 1 on errors raised by the computation, 2 on usage errors.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// A path as given, else the same name (with ".nc" appended if missing)
/// in the bundled and installed fixture directories.
std::filesystem::path locate_fixture(std::string_view name);

}  // namespace lnc::cli
