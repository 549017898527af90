#pragma once

#include <string>

#include "aquannr/netsim/config.hpp"
#include "kv.hpp"

namespace aquannr::tools {

/// Assigns one flat config key; throws naming the key when it is unknown
/// or its value does not parse.
void sim_config_set(netsim::SimConfig& cfg, const std::string& key, const std::string& value);

/// Every addressable scalar key with its current value.
KvMap sim_config_to_kv(const netsim::SimConfig& cfg);

}  // namespace aquannr::tools
