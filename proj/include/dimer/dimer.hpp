#pragma once

#include "dimer/errors.hpp"
#include "dimer/compensated.hpp"
#include "dimer/params.hpp"
#include "dimer/operators.hpp"
#include "dimer/observables.hpp"
#include "dimer/liouvillian.hpp"
#include "dimer/linalg.hpp"
#include "dimer/bloch.hpp"
#include "dimer/steady.hpp"
#include "dimer/evolve.hpp"
