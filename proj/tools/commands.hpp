#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace spatrisk::cli {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path;
  std::optional<double> tolerance;
  unsigned threads = 1;
};

// Exit codes: 0 success, 1 config error, 2 numerical failure,
// 3 validation failure.
int cmd_risk(const CommonOptions& options);
int cmd_curve(const CommonOptions& options);
int cmd_mc(const CommonOptions& options);
int cmd_validate(const CommonOptions& options, bool inject_failure);
int cmd_piemonte(const CommonOptions& options);

}  // namespace spatrisk::cli
