#pragma once

#include "msens/common.hpp"
#include "msens/exact_arith.hpp"
#include "msens/function.hpp"
#include "msens/representation.hpp"
#include "msens/partition.hpp"
#include "msens/construction.hpp"
#include "msens/search.hpp"
#include "msens/io.hpp"
