import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    include: ["tests/**/*.test.ts"],
    exclude: process.env.E2E_BASE ? [] : ["tests/e2e.live.test.ts"],
  },
});
