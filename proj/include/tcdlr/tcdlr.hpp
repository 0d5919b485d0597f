#ifndef TCDLR_TCDLR_HPP
#define TCDLR_TCDLR_HPP

#include "tcdlr/gtsvt.hpp"
#include "tcdlr/harness.hpp"
#include "tcdlr/io.hpp"
#include "tcdlr/reference.hpp"
#include "tcdlr/solver.hpp"
#include "tcdlr/surrogate.hpp"
#include "tcdlr/sweep.hpp"
#include "tcdlr/tensor.hpp"
#include "tcdlr/tsvd.hpp"

#endif
