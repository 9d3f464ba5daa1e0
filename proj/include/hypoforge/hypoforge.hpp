#pragma once
// Umbrella header: the whole library in one include.

#include "case_study.hpp"
#include "cli_app.hpp"
#include "core.hpp"
#include "csv.hpp"
#include "date.hpp"
#include "digest.hpp"
#include "embed.hpp"
#include "errors.hpp"
#include "gateway.hpp"
#include "kg.hpp"
#include "literature.hpp"
#include "orchestrator.hpp"
#include "parsers.hpp"
#include "prompts.hpp"
#include "stats/bradley_terry.hpp"
#include "stats/classification.hpp"
#include "stats/optim.hpp"
#include "stats/quasi_variance.hpp"
#include "stats/rasch.hpp"
#include "stats/similarity.hpp"
#include "stats/tournament.hpp"
#include "text.hpp"
#include "trace.hpp"
