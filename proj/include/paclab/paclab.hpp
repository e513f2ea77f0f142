// paclab.hpp
#pragma once

#include "paclab/analysis.hpp"
#include "paclab/distribution.hpp"
#include "paclab/empirics.hpp"
#include "paclab/experiment.hpp"
#include "paclab/learners.hpp"
#include "paclab/report.hpp"
#include "paclab/rng.hpp"
#include "paclab/theory.hpp"
