#pragma once

// Umbrella header for the rirkit room-acoustics toolkit.

#include "rirkit/auralize.hpp"
#include "rirkit/compliance.hpp"
#include "rirkit/decay.hpp"
#include "rirkit/emit.hpp"
#include "rirkit/energy.hpp"
#include "rirkit/fft.hpp"
#include "rirkit/filters.hpp"
#include "rirkit/preprocess.hpp"
#include "rirkit/report.hpp"
#include "rirkit/report_json.hpp"
#include "rirkit/report_markdown.hpp"
#include "rirkit/rng.hpp"
#include "rirkit/simulate.hpp"
#include "rirkit/spatial.hpp"
#include "rirkit/spectral.hpp"
#include "rirkit/types.hpp"
#include "rirkit/wav.hpp"
