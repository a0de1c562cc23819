#pragma once

#include "dynmatch/batch_set.hpp"
#include "dynmatch/config.hpp"
#include "dynmatch/cost_meter.hpp"
#include "dynmatch/edge_key.hpp"
#include "dynmatch/epochs.hpp"
#include "dynmatch/errors.hpp"
#include "dynmatch/luby.hpp"
#include "dynmatch/matcher.hpp"
#include "dynmatch/oracle.hpp"
#include "dynmatch/stream.hpp"
