//! Procedural test material: still images and short sequences whose local
//! statistics resemble natural photographs (occluding textured objects
//! drawn from a scale-invariant size distribution, smooth illumination,
//! mild optical blur and sensor noise).

use crate::distortion::gaussian_blur;
use crate::frame::{clamp_u8, Frame, VideoSequence};
use crate::rng::Rng;

pub const DEFAULT_WIDTH: usize = 320;
pub const DEFAULT_HEIGHT: usize = 240;

/// Motion character of a generated sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SceneKind {
    /// Static background, a head-like object with small local motion.
    TalkingHead,
    /// Static background with one object drifting slowly across it.
    SlowMotion,
    /// Whole-frame pan with a rippling lower half.
    GlobalMotion,
}

impl SceneKind {
    pub const ALL: [SceneKind; 3] = [SceneKind::TalkingHead, SceneKind::SlowMotion, SceneKind::GlobalMotion];

    pub fn name(self) -> &'static str {
        match self {
            SceneKind::TalkingHead => "talking_head",
            SceneKind::SlowMotion => "slow_motion",
            SceneKind::GlobalMotion => "global_motion",
        }
    }
}

struct Plane {
    w: usize,
    h: usize,
    data: Vec<f64>,
}

impl Plane {
    fn new(w: usize, h: usize, v: f64) -> Self {
        Plane { w, h, data: vec![v; w * h] }
    }
}

/// Surface texture of one object: fractal value noise, occasionally a grating.
struct Texture {
    base: f64,
    amplitude: f64,
    grating: Option<(f64, f64, f64, f64)>,
    seed: u64,
}

impl Texture {
    fn random(rng: &mut Rng) -> Self {
        let base = 25.0 + 200.0 * rng.uniform();
        // log-uniform roughness between 0.5 and 40 grey levels
        let amplitude = (0.5f64.ln() + rng.uniform() * 80f64.ln()).exp();
        let grating = (rng.uniform() < 0.15).then(|| {
            let theta = rng.uniform() * std::f64::consts::PI;
            let freq = 0.1 + 0.5 * rng.uniform();
            (freq * theta.cos(), freq * theta.sin(), 4.0 + 10.0 * rng.uniform(), rng.uniform() * 6.0)
        });
        Texture {
            base,
            amplitude,
            grating,
            seed: rng.next_u64(),
        }
    }

    fn sample(&self, x: f64, y: f64) -> f64 {
        let mut v = self.base;
        let mut amp = self.amplitude;
        let mut freq = 1.0 / 16.0;
        for octave in 0..5u64 {
            v += amp * value_noise(x * freq, y * freq, self.seed.wrapping_add(octave));
            amp *= 0.8;
            freq *= 2.0;
        }
        if let Some((fx, fy, a, p)) = self.grating {
            v += a * (fx * x + fy * y + p).sin();
        }
        v
    }
}

fn hash2(ix: i64, iy: i64, seed: u64) -> f64 {
    let mut h = seed ^ (ix as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (iy as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    h ^= h >> 33;
    h = h.wrapping_mul(0xFF51_AFD7_ED55_8CCD);
    h ^= h >> 33;
    (h >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

/// Smooth lattice noise in [-1, 1].
fn value_noise(x: f64, y: f64, seed: u64) -> f64 {
    let (x0, y0) = (x.floor(), y.floor());
    let (tx, ty) = (x - x0, y - y0);
    let s = |t: f64| t * t * (3.0 - 2.0 * t);
    let (sx, sy) = (s(tx), s(ty));
    let (ix, iy) = (x0 as i64, y0 as i64);
    let a = hash2(ix, iy, seed);
    let b = hash2(ix + 1, iy, seed);
    let c = hash2(ix, iy + 1, seed);
    let d = hash2(ix + 1, iy + 1, seed);
    let top = a + (b - a) * sx;
    let bot = c + (d - c) * sx;
    top + (bot - top) * sy
}

struct Blob {
    cx: f64,
    cy: f64,
    rx: f64,
    ry: f64,
    rot: f64,
    texture: Texture,
}

impl Blob {
    fn random(rng: &mut Rng, w: f64, h: f64, r_min: f64, r_max: f64) -> Self {
        // radius density ∝ r⁻³ gives a scale-invariant occlusion pattern
        let u = rng.uniform();
        let r = 1.0 / (1.0 / (r_min * r_min) - u * (1.0 / (r_min * r_min) - 1.0 / (r_max * r_max))).sqrt();
        let aspect = 0.5 + rng.uniform();
        Blob {
            cx: rng.uniform() * w,
            cy: rng.uniform() * h,
            rx: r * aspect.sqrt(),
            ry: r / aspect.sqrt(),
            rot: rng.uniform() * std::f64::consts::PI,
            texture: Texture::random(rng),
        }
    }

    fn paint(&self, plane: &mut Plane, dx: f64, dy: f64) {
        let (cx, cy) = (self.cx + dx, self.cy + dy);
        let reach = self.rx.max(self.ry) + 1.0;
        let i0 = (cy - reach).floor().max(0.0) as usize;
        let i1 = ((cy + reach).ceil().max(0.0) as usize).min(plane.h);
        let j0 = (cx - reach).floor().max(0.0) as usize;
        let j1 = ((cx + reach).ceil().max(0.0) as usize).min(plane.w);
        let (sn, cs) = self.rot.sin_cos();
        for i in i0..i1 {
            for j in j0..j1 {
                let (x, y) = (j as f64 - cx, i as f64 - cy);
                let u = (x * cs + y * sn) / self.rx;
                let v = (-x * sn + y * cs) / self.ry;
                if u * u + v * v <= 1.0 {
                    // texture is attached to the object, so it moves with it
                    plane.data[i * plane.w + j] = self.texture.sample(x, y);
                }
            }
        }
    }
}

struct Scene {
    w: usize,
    h: usize,
    backdrop: Texture,
    blobs: Vec<Blob>,
    illum: (f64, f64, f64),
}

impl Scene {
    fn random(w: usize, h: usize, rng: &mut Rng) -> Self {
        let r_max = w.min(h) as f64 / 3.0;
        let count = (w * h) / 600;
        Scene {
            w,
            h,
            backdrop: Texture::random(rng),
            blobs: (0..count).map(|_| Blob::random(rng, w as f64, h as f64, 4.0, r_max)).collect(),
            illum: (0.75 + 0.2 * rng.uniform(), 0.3 * (rng.uniform() - 0.5), 0.3 * (rng.uniform() - 0.5)),
        }
    }

    fn render(&self, w: usize, h: usize, dx: f64, dy: f64) -> Plane {
        let mut p = Plane::new(w, h, 0.0);
        for i in 0..h {
            for j in 0..w {
                p.data[i * w + j] = self.backdrop.sample(j as f64 - dx, i as f64 - dy);
            }
        }
        for b in &self.blobs {
            b.paint(&mut p, dx, dy);
        }
        let (g, gx, gy) = self.illum;
        for i in 0..h {
            for j in 0..w {
                let x = (j as f64 - dx) / self.w as f64 - 0.5;
                let y = (i as f64 - dy) / self.h as f64 - 0.5;
                let v = &mut p.data[i * w + j];
                *v = 128.0 + (*v - 128.0) * g + 255.0 * (gx * x + gy * y);
            }
        }
        p
    }
}

/// Optical blur, sensor noise, quantization.
fn finish(plane: &Plane, noise: f64, rng: &mut Rng) -> Frame {
    let raw = Frame::from_f64(plane.w, plane.h, &plane.data).expect("valid plane");
    let blurred = gaussian_blur(&raw, 0.3).expect("positive sigma");
    let luma = blurred
        .luma()
        .iter()
        .map(|&v| clamp_u8(v as f64 + noise * rng.gaussian()))
        .collect();
    Frame::new(plane.w, plane.h, luma).expect("valid plane")
}

/// One pristine-looking still image.
pub fn natural_image(width: usize, height: usize, seed: u64) -> Frame {
    let mut rng = Rng::new(seed);
    let scene = Scene::random(width, height, &mut rng);
    finish(&scene.render(width, height, 0.0, 0.0), 0.5, &mut rng)
}

/// `count` images with seeds `seed, seed+1, …`.
pub fn natural_images(count: usize, width: usize, height: usize, seed: u64) -> Vec<Frame> {
    (0..count as u64).map(|k| natural_image(width, height, seed + k)).collect()
}

/// A short sequence with the given motion character.
pub fn natural_video(kind: SceneKind, frames: usize, width: usize, height: usize, seed: u64) -> VideoSequence {
    let mut rng = Rng::new(seed);
    let margin = 2 * frames + 8;
    let scene = Scene::random(width + 2 * margin, height + 2 * margin, &mut rng);
    let mut noise_rng = Rng::new(seed ^ 0x5EED);
    let out = (0..frames)
        .map(|k| {
            let t = k as f64;
            let plane = match kind {
                SceneKind::TalkingHead => {
                    let mut p = scene.render(width, height, -(margin as f64), -(margin as f64));
                    let sway = (t * 0.3).sin();
                    let head = Blob {
                        cx: width as f64 * 0.5 + sway,
                        cy: height as f64 * 0.45,
                        rx: width as f64 * 0.14,
                        ry: height as f64 * 0.26,
                        rot: 0.0,
                        texture: Texture {
                            base: 170.0,
                            amplitude: 8.0,
                            grating: None,
                            seed: 11,
                        },
                    };
                    head.paint(&mut p, 0.0, 0.0);
                    let mouth = Blob {
                        cx: head.cx,
                        cy: head.cy + head.ry * 0.5,
                        rx: head.rx * 0.35,
                        ry: 1.5 + 4.0 * (t * 0.9).sin().abs(),
                        rot: 0.0,
                        texture: Texture {
                            base: 60.0,
                            amplitude: 4.0,
                            grating: None,
                            seed: 12,
                        },
                    };
                    mouth.paint(&mut p, 0.0, 0.0);
                    p
                }
                SceneKind::SlowMotion => {
                    let mut p = scene.render(width, height, -(margin as f64), -(margin as f64));
                    let mut r = Rng::new(seed.wrapping_add(99));
                    let mut body = Blob::random(&mut r, width as f64, height as f64, 40.0, 60.0);
                    body.cx = width as f64 * 0.3 + 1.0 * t;
                    body.cy = height as f64 * 0.6;
                    body.paint(&mut p, 0.0, 0.0);
                    p
                }
                SceneKind::GlobalMotion => {
                    let mut p = scene.render(width, height, -(margin as f64) + 2.0 * t, -(margin as f64) + 0.5 * t);
                    for i in height / 2..height {
                        for j in 0..width {
                            let ripple = 10.0 * ((j as f64) * 0.21 + (i as f64) * 0.37 - 0.8 * t).sin();
                            p.data[i * width + j] += ripple;
                        }
                    }
                    p
                }
            };
            finish(&plane, 0.5, &mut noise_rng)
        })
        .collect();
    VideoSequence::new(out, 30.0).expect("frames share dimensions")
}
