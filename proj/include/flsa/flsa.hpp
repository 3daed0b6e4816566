#pragma once

// Convenience header pulling in the whole library.

#include <flsa/tridiagonal.hpp>
#include <flsa/loss.hpp>
#include <flsa/solver.hpp>
#include <flsa/simulate.hpp>
#include <flsa/io.hpp>
#include <flsa/experiments.hpp>
#include <flsa/cli.hpp>
