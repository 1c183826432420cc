#pragma once

#include "freeloci/invariants.hpp"
#include "freeloci/json_io.hpp"
#include "freeloci/ncrat.hpp"
