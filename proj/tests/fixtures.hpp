#pragma once

#include <string>

#include "lnc/network.hpp"

namespace lnc::test {

inline Network fixture(const std::string& name) {
  return load_network(std::string(LNC_FIXTURE_DIR) + "/" + name + ".nc");
}

}  // namespace lnc::test
