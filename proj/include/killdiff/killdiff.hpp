#pragma once

#include "killdiff/calib.hpp"
#include "killdiff/contact.hpp"
#include "killdiff/greens.hpp"
#include "killdiff/io.hpp"
#include "killdiff/mc.hpp"
#include "killdiff/model.hpp"
#include "killdiff/pde.hpp"
#include "killdiff/perturb.hpp"
#include "killdiff/quadrature.hpp"
#include "killdiff/special.hpp"
#include "killdiff/validate.hpp"
