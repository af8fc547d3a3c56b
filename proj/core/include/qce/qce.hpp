#pragma once

#include "qce/bloch.hpp"
#include "qce/ensemble.hpp"
#include "qce/errors.hpp"
#include "qce/estimator.hpp"
#include "qce/interferometer.hpp"
#include "qce/json_io.hpp"
#include "qce/rng.hpp"
#include "qce/sum.hpp"
