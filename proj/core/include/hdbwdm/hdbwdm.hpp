#pragma once

#include "hdbwdm/clustering.hpp"
#include "hdbwdm/csv_io.hpp"
#include "hdbwdm/datagen.hpp"
#include "hdbwdm/figures.hpp"
#include "hdbwdm/geometry_stats.hpp"
#include "hdbwdm/harness.hpp"
#include "hdbwdm/projection.hpp"
#include "hdbwdm/rng.hpp"
#include "hdbwdm/types.hpp"
#include "hdbwdm/validity.hpp"
