/**
 * Builders turning kernel scene data into three.js objects.
 *
 * Shading mirrors the kernel renderer: with baked ambient occlusion the
 * vertex colors are the base colors scaled by the AO term and no light
 * is applied; without it (the interactive fallback) a headlight Lambert
 * term is applied by the material.  Wireframe segment opacity is baked
 * into vertex colors blended toward the background, since line materials
 * have no per-segment alpha.
 */

import * as THREE from "three";

import { SceneData, WireframeData } from "./protocol.js";
import { Status } from "./status.js";

export function surfaceGeometry(
  surface: NonNullable<SceneData["surface"]>,
  useAo: boolean,
): THREE.BufferGeometry {
  const geo = new THREE.BufferGeometry();
  geo.setAttribute("position", new THREE.BufferAttribute(surface.positions, 3));
  geo.setAttribute("normal", new THREE.BufferAttribute(surface.normals, 3));
  let colors = surface.colors;
  if (useAo && surface.ao) {
    colors = new Float32Array(surface.colors.length);
    for (let v = 0; v < surface.count; v++) {
      const a = surface.ao[v];
      colors[3 * v] = surface.colors[3 * v] * a;
      colors[3 * v + 1] = surface.colors[3 * v + 1] * a;
      colors[3 * v + 2] = surface.colors[3 * v + 2] * a;
    }
  }
  geo.setAttribute("color", new THREE.BufferAttribute(colors, 3));
  geo.setIndex(new THREE.BufferAttribute(surface.indices, 1));
  return geo;
}

export function surfaceMesh(scene: SceneData, status: Status): THREE.Mesh | null {
  if (!scene.surface) return null;
  const useAo = status.lighting === "ao" && scene.meta.ao_baked && !!scene.surface.ao;
  const geo = surfaceGeometry(scene.surface, useAo);
  const material = useAo
    ? new THREE.MeshBasicMaterial({ vertexColors: true })
    : new THREE.MeshLambertMaterial({ vertexColors: true });
  const mesh = new THREE.Mesh(geo, material);
  mesh.name = "surface";
  return mesh;
}

export function silhouetteMesh(scene: SceneData, status: Status): THREE.Mesh | null {
  if (!scene.silhouette || status.silhouette_alpha <= 0) return null;
  const geo = surfaceGeometry(scene.silhouette, false);
  const material = new THREE.MeshBasicMaterial({
    vertexColors: true,
    transparent: true,
    opacity: status.silhouette_alpha,
    depthWrite: false,
  });
  const mesh = new THREE.Mesh(geo, material);
  mesh.name = "silhouette";
  mesh.renderOrder = 2;
  return mesh;
}

export function wireframeLines(
  wire: WireframeData,
  background: [number, number, number],
): THREE.LineSegments | null {
  const k = wire.segments.length;
  if (k === 0) return null;
  const positions = new Float32Array(k * 6);
  const colors = new Float32Array(k * 6);
  for (let s = 0; s < k; s++) {
    const [a, b] = wire.segments[s];
    positions.set(a, s * 6);
    positions.set(b, s * 6 + 3);
    const alpha = wire.opacity[s];
    const c = wire.colors[s];
    for (const end of [0, 3]) {
      colors[s * 6 + end] = c[0] * alpha + background[0] * (1 - alpha);
      colors[s * 6 + end + 1] = c[1] * alpha + background[1] * (1 - alpha);
      colors[s * 6 + end + 2] = c[2] * alpha + background[2] * (1 - alpha);
    }
  }
  const geo = new THREE.BufferGeometry();
  geo.setAttribute("position", new THREE.BufferAttribute(positions, 3));
  geo.setAttribute("color", new THREE.BufferAttribute(colors, 3));
  const lines = new THREE.LineSegments(
    geo, new THREE.LineBasicMaterial({ vertexColors: true })
  );
  lines.name = "wireframe";
  lines.renderOrder = 1;
  return lines;
}

export function irregularLines(scene: SceneData): THREE.LineSegments | null {
  const irr = scene.irregular;
  if (irr.mode === "off" || irr.segments.length === 0) return null;
  const k = irr.segments.length;
  const positions = new Float32Array(k * 6);
  const colors = new Float32Array(k * 6);
  for (let s = 0; s < k; s++) {
    positions.set(irr.segments[s][0], s * 6);
    positions.set(irr.segments[s][1], s * 6 + 3);
    colors.set(irr.colors[s], s * 6);
    colors.set(irr.colors[s], s * 6 + 3);
  }
  const geo = new THREE.BufferGeometry();
  geo.setAttribute("position", new THREE.BufferAttribute(positions, 3));
  geo.setAttribute("color", new THREE.BufferAttribute(colors, 3));
  const material = new THREE.LineBasicMaterial({
    vertexColors: true,
    depthTest: !irr.xray,
  });
  const lines = new THREE.LineSegments(geo, material);
  lines.name = "irregular";
  lines.renderOrder = irr.xray ? 10 : 3;
  return lines;
}

/** Compose the full three.js scene from kernel data and the status. */
export function buildScene(data: SceneData, status: Status): THREE.Scene {
  const scene = new THREE.Scene();
  const bg = status.color_background;
  scene.background = new THREE.Color(bg[0], bg[1], bg[2]);
  const surface = surfaceMesh(data, status);
  if (surface) scene.add(surface);
  const sil = silhouetteMesh(data, status);
  if (sil) scene.add(sil);
  const wire = wireframeLines(data.wireframe, [bg[0], bg[1], bg[2]]);
  if (wire) scene.add(wire);
  const irr = irregularLines(data);
  if (irr) scene.add(irr);
  if (!(surface?.material instanceof THREE.MeshBasicMaterial)) {
    // headlight for the direct-lighting fallback
    const light = new THREE.DirectionalLight(0xffffff, 1.0);
    light.name = "headlight";
    const d = status.camera_direction;
    light.position.set(-d[0], -d[1], -d[2]);
    scene.add(light);
  }
  return scene;
}

/** Camera matching the kernel's framing (auto-distance when <= 0). */
export function buildCamera(status: Status, bounds: [number[], number[]]): THREE.PerspectiveCamera {
  const [w, h] = status.image_size;
  const camera = new THREE.PerspectiveCamera(45, w / h, 0.001, 1e6);
  const [lo, hi] = bounds;
  const diag = Math.hypot(hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]) || 1;
  let target = new THREE.Vector3(...status.camera_target);
  let distance = status.camera_distance;
  if (distance <= 0) {
    target = new THREE.Vector3(
      (lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2
    );
    distance = (0.5 * diag) / Math.tan((Math.PI / 180) * 45 / 2) * 1.25 + 0.05 * diag;
  }
  const dir = new THREE.Vector3(...status.camera_direction).normalize();
  camera.position.copy(target).addScaledVector(dir, -distance);
  camera.up.set(...status.camera_up);
  camera.lookAt(target);
  camera.near = Math.max(1e-6, distance * 1e-3);
  camera.far = distance * 100;
  camera.updateProjectionMatrix();
  return camera;
}
