#pragma once

#include "mvinterp/error.hpp"
#include "mvinterp/multiindex.hpp"
#include "mvinterp/nodes.hpp"
#include "mvinterp/newton.hpp"
#include "mvinterp/transform.hpp"
#include "mvinterp/scattered.hpp"
#include "mvinterp/dual.hpp"
#include "mvinterp/approx.hpp"
