#pragma once

// Everything, for tools that want the whole library.

#include "cwflab/base_cwf.hpp"
#include "cwflab/bundled.hpp"
#include "cwflab/cwf.hpp"
#include "cwflab/enumerate.hpp"
#include "cwflab/error.hpp"
#include "cwflab/fincat.hpp"
#include "cwflab/fixtures.hpp"
#include "cwflab/internal.hpp"
#include "cwflab/json_io.hpp"
#include "cwflab/manifest.hpp"
#include "cwflab/modality.hpp"
#include "cwflab/mutate.hpp"
#include "cwflab/pi.hpp"
#include "cwflab/presheaf.hpp"
#include "cwflab/report.hpp"
#include "cwflab/suites.hpp"
#include "cwflab/value.hpp"
