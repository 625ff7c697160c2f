#pragma once

#include "riesz/numeric.hpp"
#include "riesz/stream.hpp"
#include "riesz/measure_space.hpp"
#include "riesz/step_function.hpp"
#include "riesz/monotone_class.hpp"
#include "riesz/signed_class.hpp"
#include "riesz/measurable.hpp"
#include "riesz/product.hpp"
#include "riesz/io.hpp"
#include "riesz/gallery.hpp"
#include "riesz/random.hpp"
#include "riesz/selftest.hpp"
