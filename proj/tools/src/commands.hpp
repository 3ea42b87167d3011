#pragma once

#include "config.hpp"

namespace sxai::cli {

void cmd_synth(const RunConfig& config);
void cmd_train(const RunConfig& config);
void cmd_evaluate(const RunConfig& config);
void cmd_explain_global(const RunConfig& config);
void cmd_explain_local(const RunConfig& config);
void cmd_correlate(const RunConfig& config);

}  // namespace sxai::cli
