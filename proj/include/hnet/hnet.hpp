#pragma once

// Umbrella header.
#include "hnet/bitvector.hpp"
#include "hnet/combi.hpp"
#include "hnet/engine.hpp"
#include "hnet/error.hpp"
#include "hnet/graph.hpp"
#include "hnet/ingest.hpp"
#include "hnet/mtm.hpp"
#include "hnet/report.hpp"
#include "hnet/score.hpp"
#include "hnet/simulate.hpp"
#include "hnet/stats.hpp"
