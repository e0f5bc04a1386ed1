#pragma once

#include "tenlog/error.hpp"
#include "tenlog/tensor.hpp"
#include "tenlog/model.hpp"
#include "tenlog/truth_calculus.hpp"
#include "tenlog/set_calculus.hpp"
#include "tenlog/formula.hpp"
#include "tenlog/dsl.hpp"
#include "tenlog/evaluator.hpp"
#include "tenlog/sweep.hpp"
