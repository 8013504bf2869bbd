/*
 * Copyright 2026 The HSA Lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Batch front end: bounds, build, verify, simulate, report.
//
// Exit codes: 0 everything passed, 1 a verification failed, 2 the
// configuration or an input file is invalid.

#ifndef HSA_CLI_H_
#define HSA_CLI_H_

#include <iosfwd>
#include <string>

#include "hsa/serialize.h"

namespace hsa {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

struct CliOptions {
  std::string config_path;
  std::string scheme_path;
  std::string out_path;
  bool expect_feasible = false;
  bool all_sizes = false;
};

// Scheme described by the config. Throws Error.
Scheme BuildFromConfig(const RunConfig& c);

Json BoundsFragment(const RunConfig& c);

struct ReportResult {
  Json report;
  bool pass = false;
};
// Verification plus the rate comparison, for a scheme that matches the
// config's topology. Timing lives under "timing" only.
ReportResult MakeReport(const RunConfig& c, const Scheme& s);

int CmdBounds(const CliOptions& o, std::ostream& out, std::ostream& err);
int CmdBuild(const CliOptions& o, std::ostream& out, std::ostream& err);
int CmdVerify(const CliOptions& o, std::ostream& out, std::ostream& err);
int CmdSimulate(const CliOptions& o, std::ostream& out, std::ostream& err);
int CmdReport(const CliOptions& o, std::ostream& out, std::ostream& err);

int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hsa

#endif  // HSA_CLI_H_
