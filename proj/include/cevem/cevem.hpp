#pragma once

#include "cevem/bridge.hpp"
#include "cevem/config.hpp"
#include "cevem/diagnostics.hpp"
#include "cevem/em_scheme.hpp"
#include "cevem/error.hpp"
#include "cevem/model.hpp"
#include "cevem/montecarlo.hpp"
#include "cevem/parallel.hpp"
#include "cevem/report.hpp"
#include "cevem/rng.hpp"
#include "cevem/tables.hpp"
#include "cevem/truncated_oracle.hpp"
#include "cevem/version.hpp"
