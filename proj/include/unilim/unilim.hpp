#pragma once

#include "unilim/error.hpp"
#include "unilim/rational.hpp"
#include "unilim/tower.hpp"
#include "unilim/relation.hpp"
#include "unilim/limit_metric.hpp"
#include "unilim/topology.hpp"
#include "unilim/regularity.hpp"
#include "unilim/constructions.hpp"
