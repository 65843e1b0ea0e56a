#pragma once

#include "config.hpp"

namespace hmin::cli {

enum ExitCode { kOk = 0, kConfig = 2, kForbidden = 3, kVerifyFailed = 4, kNumerical = 5 };

int cmd_solve(const RunConfig& cfg);
int cmd_scan(const RunConfig& cfg);
int cmd_closed(const RunConfig& cfg);
int cmd_lift(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_export(const RunConfig& cfg);

// Sidecar of a cloud CSV: same path with the extension replaced by .json.
std::string sidecar_path(const std::string& cloud_path);

}  // namespace hmin::cli
