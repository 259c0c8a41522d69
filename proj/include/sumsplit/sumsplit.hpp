#pragma once

#include "sumsplit/arrays.hpp"
#include "sumsplit/extend.hpp"
#include "sumsplit/gamma.hpp"
#include "sumsplit/generators.hpp"
#include "sumsplit/geometry.hpp"
#include "sumsplit/io.hpp"
#include "sumsplit/pipeline.hpp"
#include "sumsplit/quantize.hpp"
#include "sumsplit/sample.hpp"
