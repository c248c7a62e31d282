#ifndef SLOWRATE_RATEKIT_HPP
#define SLOWRATE_RATEKIT_HPP

#include "slowrate/ratekit/checks.hpp"
#include "slowrate/ratekit/classify.hpp"
#include "slowrate/ratekit/predict.hpp"
#include "slowrate/ratekit/sequence_tools.hpp"

#endif  // SLOWRATE_RATEKIT_HPP
