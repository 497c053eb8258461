#pragma once

// Umbrella header for the satlab library: domain types and evaluation
// (core), seeded samplers for the four formula distributions (samplers),
// exact solution-space enumeration (enumeration), first-moment rate
// calculus and certificates (analytic), the exact tiny-universe verifier
// (tiny_universe), DIMACS I/O (dimacs), and experiment drivers
// (experiments).

#include "satlab/analytic.hpp"
#include "satlab/bigint.hpp"
#include "satlab/core.hpp"
#include "satlab/dimacs.hpp"
#include "satlab/enumeration.hpp"
#include "satlab/errors.hpp"
#include "satlab/experiments.hpp"
#include "satlab/rng.hpp"
#include "satlab/samplers.hpp"
#include "satlab/stats.hpp"
#include "satlab/tiny_universe.hpp"
