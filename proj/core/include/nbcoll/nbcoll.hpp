#pragma once

#include "nbcoll/blowup.hpp"
#include "nbcoll/equilibria.hpp"
#include "nbcoll/errors.hpp"
#include "nbcoll/jacobi.hpp"
#include "nbcoll/nbody.hpp"
#include "nbcoll/ode.hpp"
#include "nbcoll/pipeline.hpp"
#include "nbcoll/regularization.hpp"
#include "nbcoll/shape.hpp"
#include "nbcoll/so3.hpp"
#include "nbcoll/spin_lab.hpp"
#include "nbcoll/types.hpp"
#include "nbcoll/verify.hpp"
