#ifndef ADER_ADER_HPP
#define ADER_ADER_HPP

/**
 * Umbrella header for the whole library. The algorithm core
 * (everything except config_json.hpp and harness.hpp) depends only on
 * the standard library; the two harness headers additionally expect
 * nlohmann/json on the include path.
 */

#include "ader/bounds.hpp"
#include "ader/comparators.hpp"
#include "ader/config_json.hpp"
#include "ader/core.hpp"
#include "ader/dynamics.hpp"
#include "ader/environments.hpp"
#include "ader/experts.hpp"
#include "ader/feasible_set.hpp"
#include "ader/harness.hpp"
#include "ader/loss.hpp"
#include "ader/meta.hpp"
#include "ader/runner.hpp"
#include "ader/trace_io.hpp"

#endif  // ADER_ADER_HPP
