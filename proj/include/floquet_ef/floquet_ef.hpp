// floquet_ef.hpp — umbrella header

#pragma once

#include "floquet_ef/types.hpp"
#include "floquet_ef/model.hpp"
#include "floquet_ef/floquet.hpp"
#include "floquet_ef/quadrature.hpp"
#include "floquet_ef/integrands.hpp"
#include "floquet_ef/fields.hpp"
#include "floquet_ef/transport.hpp"
#include "floquet_ef/parallel.hpp"
#include "floquet_ef/grid.hpp"
#include "floquet_ef/dynamics.hpp"
#include "floquet_ef/config.hpp"
#include "floquet_ef/csv.hpp"
#include "floquet_ef/commands.hpp"
#include "floquet_ef/validate.hpp"
