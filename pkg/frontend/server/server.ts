/**
 * Development server: static viewer files plus a thin HTTP bridge from
 * the browser's message protocol to the CLI kernel host.
 */

import express from "express";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { CliKernel } from "./cliKernel.js";
import { parseStatus, Status } from "../src/status.js";

const here = dirname(fileURLToPath(import.meta.url));
const root = join(here, "..", "..");

export function createApp(kernel: CliKernel) {
  const app = express();
  app.use(express.raw({ type: "application/octet-stream", limit: "512mb" }));
  app.use(express.json({ limit: "64mb" }));
  app.use(express.static(join(root)));
  app.use("/dist", express.static(join(root, "dist")));
  app.use("/node_modules", express.static(join(root, "node_modules")));

  const statusOf = (body: { status: unknown }): Status =>
    parseStatus(JSON.stringify(body.status)).status;

  app.post("/api/load", async (req, res) => {
    try {
      const name = String(req.query.name ?? "mesh.mesh");
      const info = await kernel.loadMesh(name, new Uint8Array(req.body as Buffer));
      res.json(info);
    } catch (err) {
      res.status(400).json({ error: String(err) });
    }
  });

  app.post("/api/scene", async (req, res) => {
    try {
      const data = await kernel.sceneArchive(statusOf(req.body), req.body.options ?? {});
      res.type("application/zip").send(Buffer.from(data));
    } catch (err) {
      res.status(400).json({ error: String(err) });
    }
  });

  app.post("/api/render", async (req, res) => {
    try {
      const png = await kernel.render(statusOf(req.body), req.body.options ?? {});
      res.type("image/png").send(Buffer.from(png));
    } catch (err) {
      res.status(400).json({ error: String(err) });
    }
  });

  app.post("/api/pick", async (req, res) => {
    try {
      const out = await kernel.pick(
        statusOf(req.body), req.body.screen, req.body.action ?? "report"
      );
      res.json(out);
    } catch (err) {
      res.status(400).json({ error: String(err) });
    }
  });

  app.post("/api/plane-from-view", async (req, res) => {
    try {
      const status = await kernel.planeFromView(
        statusOf(req.body), req.body.viewDir, !!req.body.snap
      );
      res.json(status);
    } catch (err) {
      res.status(400).json({ error: String(err) });
    }
  });

  return app;
}

const isMain = process.argv[1] && fileURLToPath(import.meta.url) === process.argv[1];
if (isMain) {
  const kernel = new CliKernel();
  const app = createApp(kernel);
  const port = Number(process.env.PORT ?? 8765);
  app.listen(port, () => {
    console.log(`viewer at http://localhost:${port}/`);
  });
}
