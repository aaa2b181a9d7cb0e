import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    include: ["tests/**/*.test.ts"],
    exclude: [
      "**/node_modules/**",
      ...(process.env.METAFORGE_E2E ? [] : ["tests/e2e.test.ts"]),
    ],
    testTimeout: 30000,
  },
});
