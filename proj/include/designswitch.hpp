#ifndef DESIGNSWITCH_HPP
#define DESIGNSWITCH_HPP

#include "designswitch/bit_matrix.hpp"
#include "designswitch/canon.hpp"
#include "designswitch/classify.hpp"
#include "designswitch/design.hpp"
#include "designswitch/error.hpp"
#include "designswitch/gf_rank.hpp"
#include "designswitch/hadamard.hpp"
#include "designswitch/incidence.hpp"
#include "designswitch/isomorphism.hpp"
#include "designswitch/orbit_matrix.hpp"
#include "designswitch/sign_matrix.hpp"
#include "designswitch/switching.hpp"

#endif
