#pragma once

#include "goodman/asymmetry.hpp"
#include "goodman/covering.hpp"
#include "goodman/error.hpp"
#include "goodman/generators.hpp"
#include "goodman/geometry.hpp"
#include "goodman/inscribing.hpp"
#include "goodman/instance_io.hpp"
#include "goodman/interval_lemmas.hpp"
#include "goodman/lp.hpp"
#include "goodman/separability.hpp"
#include "goodman/svg.hpp"
