#pragma once

#include "isoflow/diagnostics.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/flow.hpp"
#include "isoflow/flows.hpp"
#include "isoflow/integrators.hpp"
#include "isoflow/linalg.hpp"
#include "isoflow/random.hpp"
#include "isoflow/subspace.hpp"
#include "isoflow/tableaux.hpp"
#include "isoflow/version.hpp"
