#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "subsum/errors.hpp"

namespace subsum::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // domain/capacity error or failed verification
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Reads JSONL records and writes CSV with the requested columns. A column name is looked up
/// as a dotted path if it contains '.', else at top level, then under "result", then "params".
/// Columns holding "num/den" strings get an extra "<name>_float" column.
/// Throws DomainError naming the record index when a column is missing.
void export_csv(std::istream& in, std::span<const std::string> columns, std::ostream& out);

}  // namespace subsum::cli
