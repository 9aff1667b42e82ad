import { resolve } from "node:path";
import { defineConfig } from "vitest/config";

// REST and websocket calls go to the play service.
const backend = process.env.PAIRMIND_BACKEND ?? "http://127.0.0.1:8000";

export default defineConfig({
  build: {
    rollupOptions: {
      input: {
        main: resolve(__dirname, "index.html"),
        audit: resolve(__dirname, "audit.html"),
      },
    },
  },
  server: {
    proxy: {
      "/sessions": { target: backend, ws: true },
      "/policies": { target: backend },
      "/templates": { target: backend },
    },
  },
  test: {
    environment: "happy-dom",
  },
});
