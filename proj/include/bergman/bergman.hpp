#ifndef BERGMAN_BERGMAN_HPP_
#define BERGMAN_BERGMAN_HPP_

#include "bergman/analytic_fn.hpp"
#include "bergman/annihilator.hpp"
#include "bergman/bergman_space.hpp"
#include "bergman/core.hpp"
#include "bergman/disk_geometry.hpp"
#include "bergman/expression.hpp"
#include "bergman/interpolation.hpp"
#include "bergman/jet.hpp"
#include "bergman/m_sequence.hpp"
#include "bergman/operator_lab.hpp"
#include "bergman/property_suite.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/serialize.hpp"
#include "bergman/small_linalg.hpp"
#include "bergman/space_params.hpp"

#endif  // BERGMAN_BERGMAN_HPP_
