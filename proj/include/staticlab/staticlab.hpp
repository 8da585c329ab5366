#ifndef STATICLAB_STATICLAB_HPP
#define STATICLAB_STATICLAB_HPP

// Umbrella header: the whole library in dependency order.

#include "staticlab/common.hpp"
#include "staticlab/profile.hpp"
#include "staticlab/ode.hpp"
#include "staticlab/models.hpp"
#include "staticlab/oracle.hpp"
#include "staticlab/verifier.hpp"
#include "staticlab/classifier.hpp"
#include "staticlab/catalog.hpp"
#include "staticlab/io.hpp"

#endif  // STATICLAB_STATICLAB_HPP
