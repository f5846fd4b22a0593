#pragma once

#include "gumdp/bounds.hpp"
#include "gumdp/builtins.hpp"
#include "gumdp/chain.hpp"
#include "gumdp/errors.hpp"
#include "gumdp/exact.hpp"
#include "gumdp/harness.hpp"
#include "gumdp/io.hpp"
#include "gumdp/linalg.hpp"
#include "gumdp/model.hpp"
#include "gumdp/random.hpp"
#include "gumdp/sampler.hpp"
