#ifndef HODGEFIR_HODGEFIR_HPP
#define HODGEFIR_HODGEFIR_HPP

#include "complex.hpp"
#include "design.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "filtering.hpp"
#include "io.hpp"
#include "spectral.hpp"

#endif
