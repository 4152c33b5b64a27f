#pragma once

#include <boost/multiprecision/float128.hpp>

namespace qseries {

using Quad = boost::multiprecision::float128;

}  // namespace qseries
