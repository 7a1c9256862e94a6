#pragma once

#include "peaksync/correlate.hpp"
#include "peaksync/error.hpp"
#include "peaksync/ingest.hpp"
#include "peaksync/normal.hpp"
#include "peaksync/parallel.hpp"
#include "peaksync/peaks.hpp"
#include "peaksync/pipeline.hpp"
#include "peaksync/preprocess.hpp"
#include "peaksync/random.hpp"
#include "peaksync/record.hpp"
#include "peaksync/surrogate.hpp"
#include "peaksync/sync.hpp"
#include "peaksync/synth.hpp"
#include "peaksync/weights.hpp"

namespace peaksync {
inline constexpr const char* kVersion = "0.1.0";
}
