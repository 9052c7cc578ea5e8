/**
 * Browser bootstrap: wires file drops, sliders, buttons, the trackball
 * and the three.js canvas to a Session backed by the HTTP kernel.
 */

import * as THREE from "three";

import { applySlider, SLIDERS } from "./controls.js";
import { HttpKernel } from "./kernelHttp.js";
import { buildCamera, buildScene } from "./scene.js";
import { Session } from "./session.js";
import { METRIC_IDS, COLORMAPS, MODES, Status } from "./status.js";
import { Trackball } from "./trackball.js";

export function startApp(root: HTMLElement): Session {
  const kernel = new HttpKernel();
  const session = new Session(kernel, { aoProbes: 256 });

  root.innerHTML = `
    <div class="layout">
      <div id="view" class="view" tabindex="0"></div>
      <div class="panel">
        <div id="drop" class="drop">drop a .mesh / .vtk file or a snapshot .png</div>
        <div id="controls"></div>
        <div class="row">
          <button id="set-plane">set plane</button>
          <button id="invert-plane">invert</button>
          <button id="snapshot">snapshot</button>
          <button id="copy">copy status</button>
          <button id="paste">paste status</button>
        </div>
        <div class="row">
          <label>metric <select id="metric"></select></label>
          <label>colormap <select id="colormap"></select></label>
          <label>mode <select id="mode"></select></label>
          <label>lighting <select id="lighting">
            <option value="ao">ao</option><option value="direct">direct</option>
          </select></label>
        </div>
        <div class="row">
          <label>pick <select id="pick-action">
            <option value="dig">dig</option>
            <option value="undig">undig</option>
            <option value="isolate">isolate</option>
          </select></label>
          <span id="ao-state"></span>
        </div>
        <pre id="info"></pre>
      </div>
    </div>`;

  const view = root.querySelector<HTMLDivElement>("#view")!;
  const info = root.querySelector<HTMLPreElement>("#info")!;
  const aoLabel = root.querySelector<HTMLSpanElement>("#ao-state")!;

  const fill = (id: string, values: readonly string[]) => {
    const select = root.querySelector<HTMLSelectElement>(`#${id}`)!;
    for (const v of values) {
      const option = document.createElement("option");
      option.value = v;
      option.textContent = v;
      select.appendChild(option);
    }
    return select;
  };
  const metricSel = fill("metric", METRIC_IDS);
  const colormapSel = fill("colormap", COLORMAPS);
  const modeSel = fill("mode", MODES);
  const lightingSel = root.querySelector<HTMLSelectElement>("#lighting")!;

  const controls = root.querySelector<HTMLDivElement>("#controls")!;
  for (const spec of SLIDERS) {
    const row = document.createElement("label");
    row.className = "slider";
    row.textContent = spec.label;
    const input = document.createElement("input");
    input.type = "range";
    input.min = "0";
    input.max = "1";
    input.step = spec.steps ? String(1 / (spec.steps - 1)) : "0.001";
    input.value = "0";
    input.addEventListener("input", () => {
      applySlider(session.status, session.scene?.meta ?? null, spec.id, Number(input.value));
      session.setField("version", session.status.version); // trigger refresh
    });
    row.appendChild(input);
    controls.appendChild(row);
  }

  metricSel.addEventListener("change", () => session.setField("metric", metricSel.value as Status["metric"]));
  colormapSel.addEventListener("change", () => session.setField("colormap", colormapSel.value as Status["colormap"]));
  modeSel.addEventListener("change", () => session.setField("mode", modeSel.value as Status["mode"]));
  lightingSel.addEventListener("change", () => session.setField("lighting", lightingSel.value as Status["lighting"]));

  // three.js canvas
  const renderer = new THREE.WebGLRenderer({ antialias: true });
  renderer.setSize(view.clientWidth || 800, view.clientHeight || 600);
  view.appendChild(renderer.domElement);
  const trackball = new Trackball(
    session.status.camera_direction, session.status.camera_up
  );
  let dragging = false;
  let last: [number, number] = [0, 0];
  renderer.domElement.addEventListener("pointerdown", (ev) => {
    dragging = true;
    last = [ev.clientX, ev.clientY];
  });
  window.addEventListener("pointerup", () => (dragging = false));
  window.addEventListener("pointermove", (ev) => {
    if (!dragging) return;
    const w = renderer.domElement.clientWidth;
    const h = renderer.domElement.clientHeight;
    const pose = trackball.drag((ev.clientX - last[0]) / w, (ev.clientY - last[1]) / h);
    last = [ev.clientX, ev.clientY];
    session.status.camera_direction = pose.direction;
    session.status.camera_up = pose.up;
    draw(); // camera-only: redraw locally without a kernel round trip
  });
  renderer.domElement.addEventListener("dblclick", async (ev) => {
    const rect = renderer.domElement.getBoundingClientRect();
    const x = (ev.clientX - rect.left) / rect.width;
    const y = (ev.clientY - rect.top) / rect.height;
    const action = root.querySelector<HTMLSelectElement>("#pick-action")!.value as
      "dig" | "undig" | "isolate";
    await session.pickAction([x, y], action);
  });

  function draw(): void {
    if (!session.scene) return;
    const scene = buildScene(session.scene, session.status);
    const camera = buildCamera(session.status, session.scene.meta.bounds);
    renderer.render(scene, camera);
  }

  session.on("scene", () => {
    draw();
    const meta = session.scene?.meta;
    if (meta) {
      info.textContent =
        `${meta.mesh}: ${meta.visible_cells}/${meta.cells} cells visible\n` +
        `metric ${meta.metric} in [${meta.q_min.toPrecision(4)}, ${meta.q_max.toPrecision(4)}]`;
    }
  });
  session.on("ao", () => {
    const s = session.aoState;
    aoLabel.textContent =
      s.kind === "complete" ? "AO ready" : s.kind === "partial" ? `AO ${s.probes} probes` : "AO…";
  });

  // file drop
  const drop = root.querySelector<HTMLDivElement>("#drop")!;
  drop.addEventListener("dragover", (ev) => ev.preventDefault());
  drop.addEventListener("drop", async (ev) => {
    ev.preventDefault();
    const file = ev.dataTransfer?.files?.[0];
    if (!file) return;
    try {
      await session.loadFile(file.name, new Uint8Array(await file.arrayBuffer()));
    } catch (err) {
      drop.textContent = String(err);
    }
  });

  root.querySelector("#set-plane")!.addEventListener("click", (ev) => {
    void session.setPlaneFromView((ev as MouseEvent).shiftKey);
  });
  root.querySelector("#invert-plane")!.addEventListener("click", () => session.invertPlane());
  root.querySelector("#snapshot")!.addEventListener("click", async () => {
    const png = await session.snapshot();
    const blob = new Blob([png.slice().buffer], { type: "image/png" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = `${session.meshName ?? "snapshot"}.png`;
    a.click();
  });
  root.querySelector("#copy")!.addEventListener("click", () => {
    void navigator.clipboard.writeText(session.copyStatus());
  });
  root.querySelector("#paste")!.addEventListener("click", async () => {
    try {
      session.pasteStatus(await navigator.clipboard.readText());
    } catch (err) {
      drop.textContent = String(err);
    }
  });

  return session;
}
