#pragma once

#include "bellscope/bell.hpp"
#include "bellscope/errors.hpp"
#include "bellscope/fock.hpp"
#include "bellscope/json_io.hpp"
#include "bellscope/measurement.hpp"
#include "bellscope/network.hpp"
#include "bellscope/nogo.hpp"
#include "bellscope/nogo_verify.hpp"
#include "bellscope/optimize.hpp"
#include "bellscope/rng.hpp"

namespace bellscope {
inline constexpr std::string_view kVersion = "0.1.0";
}
