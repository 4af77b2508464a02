#pragma once

#include "sae/matlin/cholesky.hpp"
#include "sae/matlin/dense.hpp"
#include "sae/matlin/real_schur.hpp"
#include "sae/matlin/sylvester.hpp"
