#pragma once

// Umbrella header for the whole toolkit.

#include "sylvkit/bounds.hpp"
#include "sylvkit/engine.hpp"
#include "sylvkit/errors.hpp"
#include "sylvkit/interval.hpp"
#include "sylvkit/primes.hpp"
#include "sylvkit/valuations.hpp"
#include "sylvkit/version.hpp"
