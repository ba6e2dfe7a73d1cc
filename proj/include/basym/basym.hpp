#pragma once

#include "basym/core.hpp"
#include "basym/debye.hpp"
#include "basym/evaluator.hpp"
#include "basym/gw_signal.hpp"
#include "basym/keyvalue.hpp"
#include "basym/meissel.hpp"
#include "basym/oracle.hpp"
#include "basym/transition.hpp"
