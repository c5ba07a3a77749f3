#pragma once

// Umbrella header for the full pipeline. The live HTTP provider is not
// included here; pull in sightkit/http_provider.hpp where needed.

#include "sightkit/config.hpp"
#include "sightkit/decode.hpp"
#include "sightkit/discovery.hpp"
#include "sightkit/dispatch.hpp"
#include "sightkit/errors.hpp"
#include "sightkit/geometry.hpp"
#include "sightkit/intent.hpp"
#include "sightkit/layout.hpp"
#include "sightkit/metrics.hpp"
#include "sightkit/news.hpp"
#include "sightkit/numerics.hpp"
#include "sightkit/tokenize.hpp"
#include "sightkit/vocabulary.hpp"
