#pragma once

#include "curv/errors.hpp"
#include "curv/jet.hpp"
#include "curv/expr.hpp"
#include "curv/metric_dsl.hpp"
#include "curv/corpus.hpp"
#include "curv/tensor.hpp"
#include "curv/jet_tensor.hpp"
#include "curv/curvature.hpp"
#include "curv/k_tensors.hpp"
#include "curv/identities.hpp"
#include "curv/structures.hpp"
#include "curv/report.hpp"
