#pragma once

#include "susmine/allocation.hpp"
#include "susmine/annotation.hpp"
#include "susmine/audit.hpp"
#include "susmine/decimal.hpp"
#include "susmine/dfg.hpp"
#include "susmine/error.hpp"
#include "susmine/fixtures.hpp"
#include "susmine/generator.hpp"
#include "susmine/impact.hpp"
#include "susmine/inventory.hpp"
#include "susmine/model.hpp"
#include "susmine/ocel.hpp"
#include "susmine/report.hpp"
#include "susmine/scoping.hpp"
#include "susmine/units.hpp"
