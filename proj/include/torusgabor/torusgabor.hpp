// Umbrella header.

#ifndef TORUSGABOR_TORUSGABOR_HPP
#define TORUSGABOR_TORUSGABOR_HPP

#include "analysis.hpp"
#include "bargmann.hpp"
#include "frames.hpp"
#include "io.hpp"
#include "matrix.hpp"
#include "signals.hpp"
#include "theta.hpp"
#include "torus_stft.hpp"

#endif
