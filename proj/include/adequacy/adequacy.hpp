#pragma once

// Umbrella header for the adequacy library.

#include "adequacy/bootstrap.hpp"
#include "adequacy/capacity_value.hpp"
#include "adequacy/copt.hpp"
#include "adequacy/csv.hpp"
#include "adequacy/error.hpp"
#include "adequacy/random.hpp"
#include "adequacy/records.hpp"
#include "adequacy/risk.hpp"
#include "adequacy/solve.hpp"
#include "adequacy/synthetic.hpp"
#include "adequacy/transforms.hpp"
