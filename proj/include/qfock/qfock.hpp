#pragma once

#include "qfock/expression.hpp"
#include "qfock/deformation.hpp"
#include "qfock/fock_matrix.hpp"
#include "qfock/paired_state.hpp"
#include "qfock/series.hpp"
#include "qfock/squeezed.hpp"
#include "qfock/thermal.hpp"
#include "qfock/sweep.hpp"
