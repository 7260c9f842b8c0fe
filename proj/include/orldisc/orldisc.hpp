#pragma once

#include "bounds.hpp"
#include "distribution.hpp"
#include "errors.hpp"
#include "localdisc.hpp"
#include "lpnorm.hpp"
#include "orlicz.hpp"
#include "pointset.hpp"
#include "quadrature.hpp"
#include "star.hpp"
#include "weight.hpp"
