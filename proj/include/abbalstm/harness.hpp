#pragma once

#include "abbalstm/harness/config.hpp"
#include "abbalstm/harness/data_io.hpp"
#include "abbalstm/harness/experiments.hpp"
#include "abbalstm/harness/outputs.hpp"
