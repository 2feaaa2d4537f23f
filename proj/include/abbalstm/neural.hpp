#pragma once

#include "abbalstm/neural/adam.hpp"
#include "abbalstm/neural/cell.hpp"
#include "abbalstm/neural/checkpoint.hpp"
#include "abbalstm/neural/init.hpp"
#include "abbalstm/neural/loss.hpp"
#include "abbalstm/neural/network.hpp"
#include "abbalstm/neural/params.hpp"
