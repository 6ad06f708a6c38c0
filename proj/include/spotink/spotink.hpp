#pragma once

#include "spotink/bincodec.hpp"
#include "spotink/bits.hpp"
#include "spotink/container.hpp"
#include "spotink/error.hpp"
#include "spotink/fixtures.hpp"
#include "spotink/image.hpp"
#include "spotink/imageio.hpp"
#include "spotink/layer_prep.hpp"
#include "spotink/metrics.hpp"
#include "spotink/mq_coder.hpp"
#include "spotink/pipeline.hpp"
#include "spotink/rdh.hpp"
