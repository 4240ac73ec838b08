#pragma once

#include <string>
#include <vector>

#include "blockdyn/lemma_lab.hpp"

namespace blockdyn::cli {

// Exit codes: 0 success, 1 config error, 2 runtime failure, 3 any failed
// verification verdict.
int parse_and_dispatch(const std::vector<std::string>& args);
int parse_and_dispatch(int argc, char** argv);

// Serializes verification results to the machine-readable report format.
std::string checks_to_json(const std::vector<lab::LemmaCheck>& checks);

// Fixed-width human summary table.
std::string checks_to_table(const std::vector<lab::LemmaCheck>& checks);

}  // namespace blockdyn::cli
