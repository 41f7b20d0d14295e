#pragma once

// Umbrella header for the whole pipeline.

#include "lensfield/bvh.hpp"
#include "lensfield/camera.hpp"
#include "lensfield/composite.hpp"
#include "lensfield/config.hpp"
#include "lensfield/gbuffer.hpp"
#include "lensfield/image.hpp"
#include "lensfield/image_io.hpp"
#include "lensfield/intersect.hpp"
#include "lensfield/lens_trace.hpp"
#include "lensfield/metrics.hpp"
#include "lensfield/pipeline.hpp"
#include "lensfield/postprocess.hpp"
#include "lensfield/ray_mask.hpp"
#include "lensfield/rng.hpp"
#include "lensfield/scene.hpp"
#include "lensfield/scene_io.hpp"
#include "lensfield/spatial.hpp"
#include "lensfield/temporal.hpp"
#include "lensfield/vec.hpp"
