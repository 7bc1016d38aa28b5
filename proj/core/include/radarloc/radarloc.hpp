#pragma once

#include "radarloc/config.hpp"
#include "radarloc/errors.hpp"
#include "radarloc/field_io.hpp"
#include "radarloc/fieldmap.hpp"
#include "radarloc/geometry.hpp"
#include "radarloc/placement.hpp"
#include "radarloc/signal_chain.hpp"
