#pragma once

#include "harmsep/errors.hpp"
#include "harmsep/gaussian_core.hpp"
#include "harmsep/hamiltonians.hpp"
#include "harmsep/measures.hpp"
#include "harmsep/septemp.hpp"
#include "harmsep/spec_io.hpp"
#include "harmsep/thermal.hpp"
