#pragma once

#include "ni/analyze.hpp"
#include "ni/chains.hpp"
#include "ni/descriptor.hpp"
#include "ni/dice.hpp"
#include "ni/enumerate.hpp"
#include "ni/error.hpp"
#include "ni/expand.hpp"
#include "ni/identity.hpp"
