#pragma once

// Umbrella header for the (m,k)-firm elevation toolkit.

#include "elevation/augment_multihop.hpp"
#include "elevation/augment_port.hpp"
#include "elevation/io.hpp"
#include "elevation/network.hpp"
#include "elevation/rational.hpp"
#include "elevation/scenario.hpp"
#include "elevation/schedule.hpp"
#include "elevation/scheduler.hpp"
#include "elevation/simulator.hpp"
#include "elevation/stream.hpp"
#include "elevation/studies.hpp"
#include "elevation/time.hpp"
#include "elevation/token_bucket.hpp"
#include "elevation/transmission_graph.hpp"
#include "elevation/weakly_hard.hpp"
