#pragma once

#include "sierpinski/error.hpp"
#include "sierpinski/gasket.hpp"
#include "sierpinski/horofunction.hpp"
#include "sierpinski/isomorphism.hpp"
#include "sierpinski/metric.hpp"
#include "sierpinski/word.hpp"
