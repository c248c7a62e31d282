#ifndef SLOWRATE_SLOWRATE_HPP
#define SLOWRATE_SLOWRATE_HPP

#include "slowrate/drivers.hpp"
#include "slowrate/errors.hpp"
#include "slowrate/extended_real.hpp"
#include "slowrate/funlib.hpp"
#include "slowrate/prox.hpp"
#include "slowrate/ratekit.hpp"
#include "slowrate/roots.hpp"

#endif  // SLOWRATE_SLOWRATE_HPP
