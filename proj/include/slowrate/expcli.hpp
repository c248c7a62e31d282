#ifndef SLOWRATE_EXPCLI_HPP
#define SLOWRATE_EXPCLI_HPP

#include "slowrate/expcli/cli.hpp"
#include "slowrate/expcli/experiments.hpp"
#include "slowrate/expcli/function_spec.hpp"
#include "slowrate/expcli/io.hpp"

#endif  // SLOWRATE_EXPCLI_HPP
