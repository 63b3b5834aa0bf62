#pragma once

// Fixed-point iteration and diagnostics on semimetric spaces: axiom
// validation, triangle functions, comparison-function calculus,
// phi-contraction certificates, Picard solvers and stability harnesses.

#include "semifix/comparison.hpp"
#include "semifix/config.hpp"
#include "semifix/contraction.hpp"
#include "semifix/equivalence.hpp"
#include "semifix/errors.hpp"
#include "semifix/ext_real.hpp"
#include "semifix/finite_space.hpp"
#include "semifix/io.hpp"
#include "semifix/line_space.hpp"
#include "semifix/random.hpp"
#include "semifix/selfmap.hpp"
#include "semifix/solver.hpp"
#include "semifix/space.hpp"
#include "semifix/stability.hpp"
#include "semifix/triangle.hpp"
