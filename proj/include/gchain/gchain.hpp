#pragma once

#include "gchain/backtest.hpp"
#include "gchain/filter.hpp"
#include "gchain/gc_dist.hpp"
#include "gchain/latent_scale.hpp"
#include "gchain/price_model.hpp"
#include "gchain/price_series.hpp"
#include "gchain/random.hpp"
#include "gchain/report.hpp"
#include "gchain/strategy.hpp"
#include "gchain/tracking.hpp"
