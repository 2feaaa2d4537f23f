#pragma once

#include "abbalstm/forecasting/forecast.hpp"
#include "abbalstm/forecasting/pipeline.hpp"
#include "abbalstm/forecasting/train.hpp"
#include "abbalstm/forecasting/windows.hpp"
