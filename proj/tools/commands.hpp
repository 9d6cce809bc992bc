#pragma once

#include <string>

#include "kinkstab/app_config.hpp"

namespace kinkstab::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2 };

struct Invocation {
  std::string subcommand;
  AppConfig config;
  std::string out_dir;
};

int cmd_profiles(const Invocation& inv);
int cmd_verify(const Invocation& inv);
int cmd_simulate(const Invocation& inv);
int cmd_sweep(const Invocation& inv);

}  // namespace kinkstab::cli
